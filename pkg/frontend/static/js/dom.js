/** Small DOM helpers; no framework, no templates. */
export function el(tag, attrs = {}, ...children) {
    const node = document.createElement(tag);
    for (const [key, value] of Object.entries(attrs)) {
        if (key === "class") {
            node.className = value;
        }
        else {
            node.setAttribute(key, value);
        }
    }
    for (const child of children) {
        if (child === null || child === undefined)
            continue;
        node.append(child instanceof Node ? child : document.createTextNode(child));
    }
    return node;
}
export function clear(node) {
    while (node.firstChild) {
        node.removeChild(node.firstChild);
    }
}
export function option(value, label) {
    return el("option", { value }, label ?? value);
}
